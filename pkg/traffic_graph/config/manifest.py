"""
Dataset Manifest Model

Maps capture files onto category names.
"""

from pathlib import Path
from typing import List

from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, field_validator, model_validator

__all__ = ["CaptureEntry", "DatasetManifest"]


class CaptureEntry(BaseModel):
    """
    One capture file and its category

    Attributes:
        path: Capture file path; relative paths resolve against the manifest directory
        label: Category name, must appear in the manifest's ``labels``
    """

    model_config = ConfigDict(extra="forbid")

    path: Path
    label: str = Field(min_length=1)

    @field_validator("path", mode="after")
    @classmethod
    def resolve_relative(cls, value: Path, info: ValidationInfo) -> Path:
        base_dir = (info.context or {}).get("base_dir")
        if base_dir is not None and not value.is_absolute():
            return Path(base_dir) / value
        return value


class DatasetManifest(BaseModel):
    """
    Dataset Manifest

    Attributes:
        labels: Ordered category names; the position is the label index
        captures: Capture files with their category names

    Example:
        Corresponding TOML file format::

            labels = ["chat", "email", "file"]

            [[captures]]
            path = "chat/facebook_chat.pcap"
            label = "chat"

            [[captures]]
            path = "email/gmail.pcap"
            label = "email"
    """

    model_config = ConfigDict(extra="forbid")

    labels: List[str] = Field(min_length=2)
    captures: List[CaptureEntry] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_labels(self) -> "DatasetManifest":
        """Every entry's label must be declared, and names must be unique"""
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("labels must be unique")
        known = set(self.labels)
        for entry in self.captures:
            if entry.label not in known:
                raise ValueError(f"capture {entry.path} has undeclared label '{entry.label}'")
        return self

    def label_index(self, name: str) -> int:
        """Index of a category name"""
        return self.labels.index(name)

