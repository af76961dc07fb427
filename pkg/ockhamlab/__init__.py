"""
ockhamlab - finite Ockham algebras and their compatible relations
Restricted Priestley duality, conjunct-atomic definability, the
finitely-many-relations classifier, alternating alter egos and the
crown and fence infinitude witnesses.
"""
from .config import LabConfig, get_config, reset_config, set_config
from .errors import ConsistencyError, MalformedInputError, OckhamLabError, ResourceCapError
from .kernel import SearchKernel, get_kernel, reset_kernel
from .structures import (
    BoundedLattice, FinStructure, OckhamAlgebra, OckhamSpace, Signature, lattice_from_order, space_from_pairs,
)
from .morphisms import Morphism, divisor, hom_search, isomorphic, isp_member
from .duality import dual_algebra, dual_space, round_trip
from .relations import OperationHost, Relation, ca_definable, census, equivalent, homset_relation, host_of
from .classifier import CatalogKind, Verdict, catalog_space, classify_algebra, classify_space
from .piggyback import AlterEgo, alternating_alter_ego, normalize, piggyback_alter_ego
from .witnesses import witness_catalog, witness_family

__all__ = [
    'LabConfig', 'get_config', 'reset_config', 'set_config',
    'ConsistencyError', 'MalformedInputError', 'OckhamLabError', 'ResourceCapError',
    'SearchKernel', 'get_kernel', 'reset_kernel',
    'BoundedLattice', 'FinStructure', 'OckhamAlgebra', 'OckhamSpace', 'Signature', 'lattice_from_order',
    'space_from_pairs',
    'Morphism', 'divisor', 'hom_search', 'isomorphic', 'isp_member',
    'dual_algebra', 'dual_space', 'round_trip',
    'OperationHost', 'Relation', 'ca_definable', 'census', 'equivalent', 'homset_relation', 'host_of',
    'CatalogKind', 'Verdict', 'catalog_space', 'classify_algebra', 'classify_space',
    'AlterEgo', 'alternating_alter_ego', 'normalize', 'piggyback_alter_ego',
    'witness_catalog', 'witness_family',
]
__version__ = '1.0.0'
