"""Congruences of finite lattices with involution, pseudo-Kleene algebras and BZ-lattices."""

from .lattice import (FiniteLattice, LatticeError, NotALattice, NotAPartialOrder, canonical_form,
                      dual, from_covers, irreducibles, is_distributive, is_isomorphic, is_modular,
                      narrows, validate)
from .partition import Partition, SizeMismatch, all_partitions
from .involution import (BZLattice, BrouwerAxiomFails, Cones, InvolutionLattice, NotAntitone,
                         NotInvolutive, NotPseudoKleene, attach_brouwer, attach_involution,
                         brouwer_complements_of, classify, cones, involutions_of, trivial_brouwer)
from .congruence import (CharacterizationMismatch, CongruenceFamily, NoExtension, NotACongruence,
                         all_congruences, atoms, bz_congruences, cep_extend, con0, con01,
                         i_congruences, i_principal_congruence, is_subdirectly_irreducible,
                         partition_join_in_eq, partition_meet, prime_of, principal_congruence,
                         quotient)
from .constructions import (B6, M3, N5, boolean_cube, build, catalog, chain, direct_product,
                            example_counts, horizontal_sum, i_ordinal_triple, ordinal_sum)
from .census import enumerate_i_lattices, enumerate_lattices

__version__ = "0.1.0"
