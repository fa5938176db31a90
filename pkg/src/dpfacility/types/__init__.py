from dpfacility.types.types import *
