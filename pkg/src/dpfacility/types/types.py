from typing import Any, Callable, Dict, List, Tuple, Union

import numpy as np

# Geometry types (a point is a length-1 or length-2 float array)
PointType = np.ndarray
FacilitiesType = np.ndarray

# Log types
LogType = Dict[str, Any]

# Mechanism types: an instance goes in, a (k, dim) array of facility points comes out
MechanismFnType = Callable[..., FacilitiesType]

# Observation checks: (description, expected, actual, passed)
CheckType = Tuple[str, float, float, bool]
CheckListType = List[CheckType]

# Per-instance audit record
RecordType = Dict[str, Union[float, int, str, bool]]
