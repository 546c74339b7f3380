from ._pramloop import *  # noqa: F401,F403
from ._pramloop import __version__  # noqa: F401
