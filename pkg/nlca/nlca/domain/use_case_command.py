from abc import ABC, abstractmethod
from typing import Any


class UseCaseCommand(ABC):
    """One CLI use case: the constructor takes its inputs, execute() runs it and returns the result."""

    def __init__(self):
        pass

    @abstractmethod
    def execute(self) -> Any:
        ...
