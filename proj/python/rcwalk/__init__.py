from ._rcwalk import *  # noqa: F401,F403
from ._rcwalk import __doc__  # noqa: F401
