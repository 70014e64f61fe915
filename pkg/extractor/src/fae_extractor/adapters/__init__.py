"""Adapter lookup: one module per encoder family, loaded lazily so that
missing runtime stacks surface as MissingDependencyError only when used."""

from __future__ import annotations

from importlib import import_module

from ..specs import EncoderSpec
from .base import EncoderAdapter


def load_adapter(spec: EncoderSpec) -> EncoderAdapter:
    module = import_module(f".{spec.adapter}", package=__name__)
    return module.load(spec)
