"""
Volume representation, mirrored indexing and file I/O.

Voxel data is held as a float32 array of shape (nx, ny, nz) indexed [i, j, k].
On disk the linear order is x fastest, then y, then z, which is the Fortran
order of that array.
"""

import dataclasses
import json
from enum import Enum
from pathlib import Path
from typing import Optional, Sequence, Tuple, Union

import nibabel as nib
import numpy as np
from loguru import logger

from nlca.errors import DimensionMismatchError, ParameterError, RegionError, VolumeFormatError

Triple = Tuple[int, int, int]
PathLike = Union[str, Path]

NIFTI_HEADER_SIZE = 348


class SampleType(str, Enum):
    UINT8 = "u8"
    INT16 = "i16"
    FLOAT32 = "f32"

    @property
    def numpy_dtype(self) -> np.dtype:
        return np.dtype({"u8": np.uint8, "i16": np.int16, "f32": np.float32}[self.value])

    @property
    def is_integral(self) -> bool:
        return self is not SampleType.FLOAT32

    @property
    def nifti_code(self) -> int:
        return {"u8": 2, "i16": 4, "f32": 16}[self.value]

    @classmethod
    def from_nifti_code(cls, code: int) -> "SampleType":
        for sample_type in cls:
            if sample_type.nifti_code == code:
                return sample_type
        raise VolumeFormatError(f"Unsupported NIfTI datatype code {code}; supported: 2 (uint8), 4 (int16), 16 (float32)")


def _as_sample_type(value) -> SampleType:
    try:
        return SampleType(value)
    except ValueError:
        raise VolumeFormatError(f"Unknown sample type {value!r}; expected one of u8, i16, f32") from None


@dataclasses.dataclass(frozen=True)
class VolumeHeader:
    dims: Triple
    spacing: Tuple[float, float, float] = (1.0, 1.0, 1.0)
    sample_type: SampleType = SampleType.FLOAT32
    endian: str = "little"

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "spacing", tuple(float(s) for s in self.spacing))
        object.__setattr__(self, "sample_type", _as_sample_type(self.sample_type))
        _check_geometry(self.dims, self.spacing)
        if self.endian not in ("little", "big"):
            raise VolumeFormatError(f"Unknown endianness {self.endian!r}")

    @property
    def voxel_count(self) -> int:
        nx, ny, nz = self.dims
        return nx * ny * nz

    @property
    def nbytes(self) -> int:
        return self.voxel_count * self.sample_type.numpy_dtype.itemsize

    @property
    def disk_dtype(self) -> np.dtype:
        return self.sample_type.numpy_dtype.newbyteorder("<" if self.endian == "little" else ">")

    def to_sidecar(self) -> dict:
        return {
            "dims": list(self.dims),
            "spacing": list(self.spacing),
            "dtype": self.sample_type.value,
            "endian": self.endian,
        }

    @classmethod
    def from_sidecar(cls, sidecar: dict) -> "VolumeHeader":
        try:
            return cls(dims=sidecar["dims"], spacing=sidecar.get("spacing", (1.0, 1.0, 1.0)),
                       sample_type=sidecar.get("dtype", "f32"), endian=sidecar.get("endian", "little"))
        except (KeyError, TypeError) as e:
            raise VolumeFormatError(f"Malformed raw sidecar: {e}") from e


def _check_geometry(dims: Sequence[int], spacing: Sequence[float]):
    if len(dims) != 3 or any(d < 1 for d in dims):
        raise VolumeFormatError(f"Volume dims must be three positive integers, got {tuple(dims)}")
    if len(spacing) != 3 or not all(np.isfinite(s) and s > 0 for s in spacing):
        raise VolumeFormatError(f"Voxel spacing must be three positive numbers, got {tuple(spacing)}")


class Volume3D:
    """Dense 3D scalar field. The voxel array is read-only once constructed."""

    def __init__(self, data, spacing: Sequence[float] = (1.0, 1.0, 1.0)):
        array = np.array(data, dtype=np.float32)
        if array.ndim != 3:
            raise VolumeFormatError(f"Volume data must be 3D, got {array.ndim}D")
        spacing = tuple(float(s) for s in spacing)
        _check_geometry(array.shape, spacing)
        array.flags.writeable = False
        self._data = array
        self._spacing = spacing

    @classmethod
    def from_linear(cls, values, dims: Sequence[int], spacing: Sequence[float] = (1.0, 1.0, 1.0)) -> "Volume3D":
        """Builds a volume from samples listed in x-fastest order."""
        values = np.asarray(values)
        dims = tuple(int(d) for d in dims)
        if values.size != int(np.prod(dims)):
            raise VolumeFormatError(f"{values.size} samples cannot fill a {dims} volume")
        return cls(values.reshape(dims, order="F"), spacing)

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def dims(self) -> Triple:
        return tuple(self._data.shape)

    @property
    def spacing(self) -> Tuple[float, float, float]:
        return self._spacing

    @property
    def voxel_count(self) -> int:
        return int(self._data.size)

    def to_linear(self) -> np.ndarray:
        return self._data.ravel(order="F")

    def with_data(self, data) -> "Volume3D":
        """New volume over `data` that keeps this volume's spacing."""
        return Volume3D(data, self._spacing)

    def require_magnitude(self):
        """Raises ParameterError unless every voxel is a valid magnitude (>= 0)."""
        if self._data.size and float(self._data.min()) < 0:
            raise ParameterError("Magnitude MRI volumes must be non-negative")

    def __repr__(self):
        return f"Volume3D(dims={self.dims}, spacing={self.spacing})"


# <editor-fold desc="Mirrored indexing">

def mirror_index(index, size: int):
    """Reflects `index` into [0, size) without repeating the edge sample (-1 -> 1, size -> size - 2)."""
    if size == 1:
        return np.zeros_like(index) if isinstance(index, np.ndarray) else 0
    period = 2 * (size - 1)
    folded = np.mod(index, period)
    reflected = np.where(folded >= size, period - folded, folded)
    return reflected if isinstance(index, np.ndarray) else int(reflected)


def sample_mirrored(volume: Volume3D, i: int, j: int, k: int) -> float:
    nx, ny, nz = volume.dims
    return float(volume.data[mirror_index(i, nx), mirror_index(j, ny), mirror_index(k, nz)])


def mirror_pad(array: np.ndarray, radius: int) -> np.ndarray:
    """Pads every axis of `array` by `radius` samples using the same reflection as sample_mirrored."""
    if radius == 0:
        return array
    axes = [mirror_index(np.arange(-radius, n + radius), n) for n in array.shape]
    return array[np.ix_(*axes)]

# </editor-fold>


def crop(volume: Volume3D, origin: Sequence[int], extent: Sequence[int]) -> Volume3D:
    origin = tuple(int(o) for o in origin)
    extent = tuple(int(e) for e in extent)
    if len(origin) != 3 or len(extent) != 3:
        raise RegionError("Crop origin and extent need three components each")
    for o, e, n in zip(origin, extent, volume.dims):
        if o < 0 or e < 1 or o + e > n:
            raise RegionError(f"Region origin={origin} extent={extent} does not fit in volume dims {volume.dims}")
    (x0, y0, z0), (ex, ey, ez) = origin, extent
    return volume.with_data(volume.data[x0:x0 + ex, y0:y0 + ey, z0:z0 + ez])


def require_same_dims(first: Volume3D, second: Volume3D):
    if first.dims != second.dims:
        raise DimensionMismatchError(f"Volume dims differ: {first.dims} vs {second.dims}")


# <editor-fold desc="Raw I/O">

def sidecar_path(path: PathLike) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".json")


def load_raw(path: PathLike, header: Optional[VolumeHeader] = None) -> Volume3D:
    """Loads a bare sample array. Without `header`, reads the JSON sidecar next to the file."""
    path = Path(path)
    if header is None:
        with open(sidecar_path(path), "r") as f:
            header = VolumeHeader.from_sidecar(json.load(f))
    payload = path.read_bytes()
    if len(payload) != header.nbytes:
        raise VolumeFormatError(f"{path}: file holds {len(payload)} bytes, header {header.dims} "
                                f"{header.sample_type.value} needs {header.nbytes}")
    samples = np.frombuffer(payload, dtype=header.disk_dtype)
    logger.debug(f"Loaded raw volume {path} dims={header.dims} dtype={header.sample_type.value}")
    return Volume3D.from_linear(samples.astype(np.float32), header.dims, header.spacing)


def quantize(values: np.ndarray, sample_type: SampleType) -> np.ndarray:
    """Clamps to the target range, then rounds half away from zero."""
    if not sample_type.is_integral:
        return values.astype(np.float32)
    info = np.iinfo(sample_type.numpy_dtype)
    clamped = np.clip(values.astype(np.float64), info.min, info.max)
    rounded = np.sign(clamped) * np.floor(np.abs(clamped) + 0.5)
    return np.clip(rounded, info.min, info.max).astype(sample_type.numpy_dtype)


def save_raw(volume: Volume3D, path: PathLike, sample_type: Union[SampleType, str] = SampleType.FLOAT32,
             write_sidecar: bool = True) -> VolumeHeader:
    sample_type = _as_sample_type(sample_type)
    header = VolumeHeader(dims=volume.dims, spacing=volume.spacing, sample_type=sample_type)
    samples = quantize(volume.to_linear(), sample_type).astype(header.disk_dtype, copy=False)
    path = Path(path)
    path.write_bytes(samples.tobytes())
    if write_sidecar:
        with open(sidecar_path(path), "w") as f:
            json.dump(header.to_sidecar(), f, indent=2)
    logger.debug(f"Saved raw volume {path} dims={header.dims} dtype={sample_type.value}")
    return header

# </editor-fold>


# <editor-fold desc="NIfTI I/O">

def load_nifti(path: PathLike) -> Tuple[Volume3D, VolumeHeader]:
    """Reads a single-file, uncompressed, 3D NIfTI-1 volume of type uint8, int16 or float32."""
    path = Path(path)
    with open(path, "rb") as f:
        if f.read(2) == b"\x1f\x8b":
            raise VolumeFormatError(f"{path}: compressed NIfTI is not supported")
        f.seek(0)
        header = nib.Nifti1Header.from_fileobj(f, check=False)
    if int(header["sizeof_hdr"]) != NIFTI_HEADER_SIZE or header["magic"].item() != b"n+1":
        raise VolumeFormatError(f"{path}: not a single-file NIfTI-1 image (bad magic)")
    sample_type = SampleType.from_nifti_code(int(header["datatype"]))
    dim = header["dim"]
    if int(dim[0]) != 3:
        raise VolumeFormatError(f"{path}: expected a 3D image, header declares {int(dim[0])} dimensions")
    dims = tuple(int(d) for d in dim[1:4])
    spacing = tuple(float(p) for p in header["pixdim"][1:4])

    image = nib.Nifti1Image.from_filename(str(path))
    values = np.asanyarray(image.dataobj.get_unscaled()).astype(np.float64)
    slope = float(header["scl_slope"])
    if slope != 0 and np.isfinite(slope):
        intercept = float(header["scl_inter"])
        values = values * slope + (intercept if np.isfinite(intercept) else 0.0)
    volume_header = VolumeHeader(dims=dims, spacing=spacing, sample_type=sample_type,
                                 endian="little" if header.endianness == "<" else "big")
    logger.debug(f"Loaded NIfTI volume {path} dims={dims} datatype={sample_type.value}")
    return Volume3D(values.reshape(dims), spacing), volume_header


def save_nifti(volume: Volume3D, path: PathLike):
    """Writes a float32 NIfTI-1 image with a diagonal affine built from the voxel spacing."""
    affine = np.diag([*volume.spacing, 1.0])
    image = nib.Nifti1Image(np.asarray(volume.data, dtype=np.float32), affine)
    image.header.set_zooms(volume.spacing)
    nib.save(image, str(path))

# </editor-fold>


def detect_format(path: PathLike, fmt: Optional[str] = None) -> str:
    if fmt is not None:
        if fmt not in ("raw", "nifti"):
            raise ParameterError(f"Unknown volume format {fmt!r}; expected raw or nifti")
        return fmt
    return "nifti" if str(path).endswith(".nii") else "raw"


def read_volume(path: PathLike, fmt: Optional[str] = None) -> Volume3D:
    if detect_format(path, fmt) == "nifti":
        return load_nifti(path)[0]
    return load_raw(path)


def write_volume(volume: Volume3D, path: PathLike, sample_type: Union[SampleType, str] = SampleType.FLOAT32,
                 fmt: Optional[str] = None):
    if detect_format(path, fmt) == "nifti":
        save_nifti(volume, path)
    else:
        save_raw(volume, path, sample_type)
