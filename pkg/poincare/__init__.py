from .config import EngineConfig
from .surfaces import ModelSurface, cubic_q, quadric, three_nondeg_j6, two_nondeg
from .kernel import JetSpace, assemble, graded_profile, param_bound, verify_solution
from .classify import FormPair, classify_pair, g0_dim, jet_action
from .flows import RationalMap, verify_exact_automorphism
from .main import main
