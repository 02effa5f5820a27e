"""Exception hierarchy shared by the library and the command-line front end."""


class NlcaError(Exception):
    """Base class of every error raised on purpose by nlca."""


class VolumeFormatError(NlcaError, ValueError):
    """A volume file or header does not match the supported layout."""


class RegionError(NlcaError, ValueError):
    """A requested sub-volume lies outside the source volume."""


class DimensionMismatchError(NlcaError, ValueError):
    """Two volumes combined voxel-wise have different dimensions."""


class ParameterError(NlcaError, ValueError):
    """A parameter value is outside its documented range."""


class SpecialFunctionRangeError(NlcaError, OverflowError):
    """A special function result is not representable as a double."""
