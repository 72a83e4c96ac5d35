"""aiida-esomit workchains."""

from .sweep import SpectrumSweepWorkChain

__all__ = ["SpectrumSweepWorkChain"]
