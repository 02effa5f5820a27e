from loguru import logger

from nlca.domain.use_case_command import UseCaseCommand
from nlca.errors import ParameterError
from nlca.phantoms import brain_phantom, two_region_phantom
from nlca.volume import write_volume


class WritePhantomCommand(UseCaseCommand):

    def __init__(self, output_path, kind="brain", dims=(64, 64, 64), modality="T1w", seed=0, sample_type="u8"):
        super().__init__()
        self.output_path = output_path
        self.kind = kind
        self.dims = tuple(dims)
        self.modality = modality
        self.seed = seed
        self.sample_type = sample_type

    def execute(self):
        if self.kind == "brain":
            volume = brain_phantom(self.dims, modality=self.modality, seed=self.seed)
        elif self.kind == "two-region":
            volume = two_region_phantom(self.dims)
        else:
            raise ParameterError(f"Unknown phantom {self.kind!r}; expected brain or two-region")
        write_volume(volume, self.output_path, self.sample_type)
        logger.info(f"Wrote {self.kind} phantom {volume.dims} to {self.output_path}")
        return volume
