#!/usr/bin/env python
# -*- coding: utf-8 -*-
""" __init__.py
Description: Spectral gaps of CMV and Jacobi operators over torus dynamics through uniform hyperbolicity of their
transfer matrix cocycles.
"""
__author__ = "Anthony Fong"
__copyright__ = "Copyright 2021, Anthony Fong"
__credits__ = ["Anthony Fong"]
__license__ = ""
__version__ = "0.1.0"
__maintainer__ = "Anthony Fong"
__email__ = ""
__status__ = "Prototype"

# Default Libraries #

# Downloaded Libraries #

# Local Libraries #
from .errors import *
from .dynamics import *
from .matrices import *
from .samplingmaps import *
from .cocycles import *
from .supports import *
from .processors import *
from .hyperbolicity import *
from .spectra import *
from .cmvperturbation import *
from .jacobiprojection import *
from .io import *
from .config import *
from .task import *
from .tasks import *
