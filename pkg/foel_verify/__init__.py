"""
foel-verify
===========

Численная проверка ферромагнитного упорядочения уровней энергии (FOEL)
для спиновых цепочек XXZ и XXX-моделей на деревьях; pytest-плагин и CLI.
"""

from .core import FoelVerifier
from .hilbert import AnisotropyParam

__version__ = "0.1.0"
__all__ = ["AnisotropyParam", "FoelVerifier"]
