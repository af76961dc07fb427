"""
Test Witnesses
Fixed alter egos, crown and fence families, psi/rho/phi, the hypothesis
check and the separation maps
"""
import pytest

from ockhamlab.errors import MalformedInputError
from ockhamlab.morphisms import is_morphism
from ockhamlab.piggyback import is_alter_ego
from ockhamlab.witnesses import (
    CATALOG, crown, crown_separation_maps, embedding_check, family_report, fence, fence_ends,
    fence_separation_maps, growth_evidence, host_algebra, infinitude_hypothesis_check, obstacle_anchors,
    phi_map, psi_map, rho_map, witness_catalog, witness_family,
)

FAMILIES = [("crown", "kleene"), ("crown", "a2"), ("fence", "a56")]


def test_host_algebras():
    """Negation tables of the four hosts, in label order"""
    assert host_algebra("kleene").neg == (2, 1, 0)
    assert host_algebra("a2").neg == (3, 3, 0, 0)
    assert host_algebra("a5").neg == (3, 3, 0, 0)
    assert host_algebra("a6").neg == (3, 3, 1, 0)
    assert host_algebra("a2").labels == ("0", "a", "b", "1")
    with pytest.raises(MalformedInputError):
        host_algebra("a7")


def test_egos_are_alter_egos():
    """Each fixed ego is compatible with its hosts"""
    assert is_alter_ego(host_algebra("kleene"), witness_catalog("kleene_ego"))
    assert is_alter_ego(host_algebra("a2"), witness_catalog("a2_ego"))
    assert is_alter_ego(host_algebra("a5"), witness_catalog("a56_ego"))
    assert is_alter_ego(host_algebra("a6"), witness_catalog("a56_ego"))
    print("[OK] Alter egos")


def test_catalog_structures():
    for name in CATALOG:
        M = witness_catalog(name)
        assert all((x, x) in M.rels["r"] for x in range(M.size))
    assert witness_catalog("gen2_bridge").labels == ("0", "a", "1", "b")
    with pytest.raises(MalformedInputError):
        witness_catalog("gen3_bridge")


def test_families_shapes():
    """Crowns have 2n points with s = {0}; fences have 2n + 1 points"""
    C = crown(3)
    assert C.size == 6
    assert (4, 5) in C.rels["r"] and (0, 5) in C.rels["r"]
    assert C.rels["s"] == frozenset({(0,)})
    F = fence(2)
    assert F.size == 5
    assert fence_ends(2) == ((0, 4), (1, 2, 3))
    assert (0, 1) in F.rels["s"] and (1, 0) not in F.rels["s"]
    with pytest.raises(MalformedInputError):
        crown(1)
    with pytest.raises(MalformedInputError):
        fence(0)


@pytest.mark.parametrize("kind,ego", FAMILIES)
def test_bridges_embed(kind, ego):
    """Each bridge embeds in a power of its ego"""
    family = witness_family(kind, ego)
    check = embedding_check(family.bridge, family.ego, family.embedding)
    assert check.ok
    assert check.failure is None


def test_embedding_check_reports_failures():
    family = witness_family("crown", "kleene")
    collapsed = [family.embedding[0]] * 3
    check = embedding_check(family.bridge, family.ego, collapsed)
    assert not check.ok
    assert check.failure.startswith("not injective")
    assert not embedding_check(family.bridge, family.ego, [(0,), (1, 1), (2,)]).ok
    with pytest.raises(MalformedInputError):
        witness_family("fence", "kleene")


def test_psi_certificates():
    """psi breaks the order of the crown and the quasi-order of the fence"""
    crowns = witness_family("crown", "kleene")
    psi = psi_map(crowns, 2)
    assert psi.map == (0, 0, 2, 0)
    assert (psi.relation, psi.violated) == ("r", (2, 1))

    fences = witness_family("fence", "a56")
    psi = psi_map(fences, 1)
    assert psi.map == (3, 3, 2)
    assert (psi.relation, psi.violated) == ("s", (0, 2))
    print("[OK] psi certificates")


@pytest.mark.parametrize("kind,ego", FAMILIES)
def test_phi_is_not_a_morphism(kind, ego):
    family = witness_family(kind, ego)
    n = family.first + 1
    rho = rho_map(family, n)
    assert rho.is_valid()
    phi = phi_map(family, n)
    assert not is_morphism(family.member(n), family.ego, phi.map)
    assert phi.to_dict()["violates"]["relation"] in ("r", "s")


def test_crown_rho_and_phi():
    family = witness_family("crown", "kleene")
    assert rho_map(family, 3).map == (0, 1, 2)
    assert phi_map(family, 3).map == (0, 0, 0, 2, 0, 0)


def test_fence_rho():
    family = witness_family("fence", "a56")
    assert rho_map(family, 2).map == (0, 0, 3, 2)


def test_hypothesis_check():
    """Smaller members pass through phi; the member itself does not"""
    crowns = witness_family("crown", "kleene")
    assert infinitude_hypothesis_check(crowns, 2, 3)
    assert not infinitude_hypothesis_check(crowns, 3, 3)
    fences = witness_family("fence", "a56")
    assert infinitude_hypothesis_check(fences, 1, 2)
    assert not infinitude_hypothesis_check(fences, 2, 2)
    with pytest.raises(MalformedInputError):
        infinitude_hypothesis_check(fences, 3, 2)
    print("[OK] Hypothesis check")


@pytest.mark.parametrize("n", [2, 3, 4])
def test_crown_separation_maps(n):
    """alpha, beta and gamma are morphisms into the Kleene ego"""
    maps = crown_separation_maps(n)
    assert len(maps) == 2 * n + 1
    assert all(phi.is_valid() for phi in maps.values())


@pytest.mark.parametrize("n", [1, 2, 3])
def test_fence_separation_maps(n):
    maps = fence_separation_maps(n)
    assert len(maps) == 2 * n + 2
    assert all(phi.is_valid() for phi in maps.values())


def test_obstacle_anchors():
    anchors = obstacle_anchors()
    assert anchors == {"Y1_boolean_square": True, "Y4_nonpermuting": True}


def test_family_report():
    report = family_report(witness_family("crown", "kleene"), 3, check=2)
    assert report["size"] == 6
    assert report["rho"] == [0, 1, 2]
    assert report["hypothesis"] == {"k": 2, "l": 3, "holds": True}
    assert report["family"]["hosts"] == ["kleene"]


@pytest.mark.slow
@pytest.mark.parametrize("kind,ego,n_max", [("crown", "kleene", 3), ("fence", "a56", 2)])
def test_growth_evidence(kind, ego, n_max):
    """Hom-set relations of successive members are pairwise inequivalent"""
    evidence = growth_evidence(witness_family(kind, ego), n_max)
    assert len(evidence.relations) == 2
    sizes = evidence.to_dict()["arities"]
    assert len(set(sizes.values())) == 2
