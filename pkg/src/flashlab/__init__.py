"""Flash rewriting codes: ILIFC, layered ILIFC, simulation and Markov analysis."""

from flashlab.codec import FlashCode, make_code
from flashlab.ilifc import IlifcCode
from flashlab.layered import LayeredCode
from flashlab.model import CodeParams

__all__ = ["CodeParams", "FlashCode", "IlifcCode", "LayeredCode", "make_code"]
__version__ = "0.1.0"
