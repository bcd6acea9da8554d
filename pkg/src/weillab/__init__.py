"""weillab: exact point counts, monodromy classification, L-function
data and bound verification for curves y^q - y = f(x) over odd finite
fields.

Everything is computed in exact arithmetic: prime-field towers with
explicit moduli, cyclotomic integers as rational coordinate vectors,
and rational reconstruction of generating series.  No floats enter any
verdict; complex embeddings appear only in diagnostics.
"""

from .errors import WeillabError

__version__ = "0.1.0"

__all__ = ["WeillabError", "__version__"]
