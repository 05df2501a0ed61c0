"""
Traffic Graph Exception Classes

Layered exception design for fine-grained error handling by callers.
The CLI maps each branch of the hierarchy onto an exit code.
"""

from typing import Optional


class TrafficGraphError(Exception):
    """
    Base Exception

    Parent class for all errors raised by this package.
    """

    def __init__(self, message: str) -> None:
        self.message = message
        super().__init__(message)


class ConfigurationError(TrafficGraphError):
    """
    Configuration Error

    Raised for invalid configuration values or unknown override keys.
    """

    def __init__(self, message: str, config_key: Optional[str] = None) -> None:
        super().__init__(message)
        self.config_key = config_key


class DataError(TrafficGraphError):
    """
    Data Error

    Parent class for problems with input captures, datasets and checkpoints.
    """

    def __init__(self, message: str, path: Optional[str] = None) -> None:
        super().__init__(message)
        self.path = path

    def __str__(self) -> str:
        if self.path:
            return f"{self.message} | path={self.path}"
        return self.message


class CaptureError(DataError):
    """
    Capture Error

    Raised when a packet capture cannot be read.
    """


class UnknownMagicError(CaptureError):
    """
    Unknown Magic Error

    Raised when a file does not start with a classic pcap magic number.
    """

    def __init__(self, magic: int, path: Optional[str] = None) -> None:
        super().__init__(f"Unknown pcap magic number: 0x{magic:08X}", path=path)
        self.magic = magic


class DatasetError(DataError):
    """
    Dataset Error

    Raised when a dataset cannot be built or read.
    """


class DatasetFormatError(DatasetError):
    """
    Dataset Format Error

    Raised when a dataset file is structurally invalid.
    """


class ChecksumError(DataError):
    """
    Checksum Error

    Raised when a dataset or checkpoint file fails its CRC32 check,
    which is how truncated or corrupted files surface.
    """

    def __init__(self, path: Optional[str] = None, expected: int = 0, found: int = 0) -> None:
        super().__init__(f"Checksum mismatch: expected 0x{expected:08X}, found 0x{found:08X}", path=path)
        self.expected = expected
        self.found = found


class SplitError(DatasetError):
    """
    Split Error

    Raised when a label has too few flows for a stratified split.
    """

    def __init__(self, label: str, count: int) -> None:
        super().__init__(f"Label '{label}' has {count} flow(s); at least 2 are required for a train/test split")
        self.label = label
        self.count = count


class CheckpointError(DataError):
    """
    Checkpoint Error

    Raised when a checkpoint cannot be read or does not fit the data.
    """


class VersionMismatchError(DataError):
    """
    Version Mismatch Error

    Raised when a file was written by an incompatible format version.
    """

    def __init__(self, found: int, expected: int, path: Optional[str] = None) -> None:
        super().__init__(f"Unsupported format version {found} (expected {expected})", path=path)
        self.found = found
        self.expected = expected


class DimensionMismatchError(CheckpointError):
    """
    Dimension Mismatch Error

    Raised when a checkpoint's class count differs from the dataset's.
    """

    def __init__(self, expected: int, found: int, what: str = "classes") -> None:
        super().__init__(f"Checkpoint has {found} {what} but the dataset has {expected}")
        self.expected = expected
        self.found = found


class GraphError(TrafficGraphError):
    """
    Graph Error

    Raised for empty byte sequences, empty graphs or unknown byte values.
    """


class LossError(TrafficGraphError):
    """
    Loss Error

    Raised for invalid loss inputs (non-positive temperature, zero-norm
    embeddings, NaN terms).
    """

    def __init__(self, message: str, term: Optional[str] = None) -> None:
        super().__init__(message)
        self.term = term


class TrainingError(TrafficGraphError):
    """
    Training Error

    Parent class for runtime failures during optimization.
    """


class TrainingDivergedError(TrainingError):
    """
    Training Diverged Error

    Raised when the loss becomes NaN or infinite.
    """

    def __init__(self, step: int, term: Optional[str] = None) -> None:
        message = f"Training diverged at step {step}"
        if term:
            message = f"{message} (term: {term})"
        super().__init__(message)
        self.step = step
        self.term = term


class GradientError(TrainingError):
    """
    Gradient Error

    Raised when a parameter receives a NaN or infinite gradient.
    """

    def __init__(self, parameter: str) -> None:
        super().__init__(f"Non-finite gradient for parameter '{parameter}'")
        self.parameter = parameter
