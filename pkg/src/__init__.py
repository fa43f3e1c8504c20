# 使 src 成为 Python 包
from . import field_linalg
from . import symplectic_pauli
from . import stabilizer_states
from . import commutation
