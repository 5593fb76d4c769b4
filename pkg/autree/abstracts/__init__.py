from .descriptor import *  # noqa
