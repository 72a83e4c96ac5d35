"""
aiida_esomit

Optomechanically induced transparency on exceptional surfaces of a
non-Hermitian whispering-gallery optomechanical system.
"""

from .version import __version__

__all__ = [
    "__version__",
]
