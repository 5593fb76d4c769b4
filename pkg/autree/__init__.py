# flake8: noqa
from .exceptions import *
from .config import *
from .utils import *
from .abstracts import *
from .tree import *
from .patterns import *
from .filters import *
from .presburger import *
from .core import *
from .autp import *
from .auta import *
from .ordered import *
from .oracle import *
from .autc import *
from .syntax import *
from .schema import *
