import pytest
from hypothesis import given, strategies as st

from oracles import cofactor_det
from resurf.errors import DomainError
from resurf.kodaira import (
    I, II, II_STAR, III, III_STAR, IV, IV_STAR, FiberConfiguration, FiberType, IStar,
    component_count, component_table, euler_number, is_nonreduced, is_reducible,
    quadratic_base_change, rnrf_base_change_configuration, rnrf_base_change_euler, t_lattice,
    validate_configuration,
)
from resurf.lattice_core import A, D, block_rank, determinant, realize

NONREDUCED = [IStar(n) for n in range(5)] + [II_STAR, III_STAR, IV_STAR]
REDUCIBLE = ([I(n) for n in range(2, 10)] + [III, IV] + [IStar(n) for n in range(5)]
             + [IV_STAR, III_STAR, II_STAR])
ALL = [I(0), I(1), II] + REDUCIBLE


@pytest.mark.parametrize("text", ["I0", "I1", "I9", "I0*", "I3*", "II", "III", "IV", "II*", "III*", "IV*"])
def test_parse_roundtrip(text):
    assert str(FiberType.parse(text)) == text


def test_parse_rejects_garbage():
    with pytest.raises(DomainError):
        FiberType.parse("V*")


def test_component_counts():
    assert component_count(IV_STAR) == 7
    assert component_count(I(1)) == 1
    assert component_count(IStar(2)) == 7
    assert [component_count(f) for f in (I(0), II, III, IV, III_STAR, II_STAR)] == [1, 1, 2, 3, 8, 9]


def test_euler_numbers():
    assert euler_number(I(5)) == 5
    assert euler_number(II) == 2
    assert euler_number(II_STAR) == 10
    assert euler_number(I(0)) == 0
    assert euler_number(IStar(3)) == 9


def test_reducibility():
    assert is_reducible(III) and not is_nonreduced(III)
    assert not is_reducible(I(1))
    assert is_nonreduced(IStar(0))


def test_t_lattice():
    assert t_lattice(I(4)) == A(3)
    assert t_lattice(IStar(2)) == D(6)
    assert t_lattice(II) is None


@pytest.mark.parametrize("f", ALL, ids=str)
def test_t_lattice_defined_iff_reducible(f):
    assert (t_lattice(f) is not None) == is_reducible(f)


@pytest.mark.parametrize("f", REDUCIBLE, ids=str)
def test_t_lattice_rank(f):
    assert block_rank(t_lattice(f)) == component_count(f) - 1


@pytest.mark.parametrize("f", REDUCIBLE, ids=str)
def test_component_table_is_a_fiber(f):
    table = component_table(f)
    n = component_count(f)
    assert len(table.multiplicities) == n
    # the whole fiber has square 0 and meets every component trivially
    assert all(table.fiber_dot(j) == 0 for j in range(n))
    assert table.multiplicities[0] == 1
    # the components away from the zero section span the opposite of T
    minor = [[-table.intersections[i][j] for j in range(1, n)] for i in range(1, n)]
    assert cofactor_det(minor) == determinant(realize(t_lattice(f)))


def test_simple_components():
    assert component_table(IV_STAR).simple_components == (0, 4, 6)
    assert component_table(III_STAR).simple_components == (0, 6)
    assert component_table(IStar(2)).simple_components == (0, 1, 2, 3)
    assert len(component_table(I(5)).simple_components) == 5


def test_base_change_table():
    assert quadratic_base_change(II) == IV
    assert quadratic_base_change(IV_STAR) == IV
    assert quadratic_base_change(IStar(0)) == I(0)
    assert quadratic_base_change(IStar(3)) == I(6)
    assert quadratic_base_change(III) == IStar(0)
    assert quadratic_base_change(I(3)) == I(6)


@pytest.mark.parametrize("f", NONREDUCED, ids=str)
def test_base_change_euler(f):
    assert euler_number(quadratic_base_change(f)) == 2 * euler_number(f) - 12


def test_validate_examples():
    assert validate_configuration(FiberConfiguration.parse(["II*", "II"])).passed
    r = validate_configuration(FiberConfiguration.parse(["I2*", "III", "I1"]))
    assert r.passed and r.euler_sum == 12
    bad = validate_configuration(FiberConfiguration.parse(["IV", "II", "5I1"]))
    assert not bad.passed and bad.euler_sum == 11
    over = validate_configuration(FiberConfiguration.parse(["II*", "II"], generic_rank=1))
    assert not over.passed


def test_configuration_shorthand():
    c = FiberConfiguration.parse(["II", "10I1"])
    assert len(c.fibers) == 11
    assert str(FiberConfiguration.parse(["II*", "II"])) == "(II, II*)"


def test_dataset_configurations_sum_to_12(cases):
    # each case realised by the simplest fibers giving T, padded with I1
    for case in cases:
        fibers = []
        for b in case.t_blocks:
            if b.family == "A":
                fibers.append(I(b.n + 1))
            elif b.family == "D":
                fibers.append(IStar(b.n - 4))
            else:
                fibers.append({6: IV_STAR, 7: III_STAR, 8: II_STAR}[b.n])
        e = sum(map(euler_number, fibers))
        if e > 12:
            continue
        fibers += [I(1)] * (12 - e)
        assert validate_configuration(FiberConfiguration(tuple(fibers), case.rank)).euler_sum == 12


def test_rnrf_examples():
    assert rnrf_base_change_euler(FiberConfiguration.parse(["II*", "II"]), II_STAR, II) == 12
    c = FiberConfiguration.parse(["I2*", "III", "I1"])
    assert rnrf_base_change_euler(c, IStar(2), III) == 12
    c = FiberConfiguration.parse(["III*", "II", "I1"])
    assert rnrf_base_change_euler(c, III_STAR, I(1)) == 12


def test_rnrf_errors():
    c = FiberConfiguration.parse(["II*", "II"])
    with pytest.raises(DomainError):
        rnrf_base_change_euler(c, II, II_STAR)
    with pytest.raises(DomainError):
        rnrf_base_change_euler(c, III_STAR, II)
    with pytest.raises(DomainError):
        rnrf_base_change_euler(c, II_STAR, III)


@pytest.mark.parametrize("f", NONREDUCED, ids=str)
def test_rnrf_euler_is_12_for_every_nonreduced_type(f):
    c = FiberConfiguration(tuple([f] + [I(1)] * (12 - euler_number(f))))
    for g in (I(0), I(1)) if euler_number(f) < 12 else (I(0),):
        assert rnrf_base_change_euler(c, f, g) == 12
        cover = rnrf_base_change_configuration(c, f, g)
        assert validate_configuration(cover).euler_sum == 12


@given(st.sampled_from(NONREDUCED), st.lists(st.sampled_from([I(1), I(2), II, III, IV, I(3)]), max_size=6))
def test_rnrf_euler_any_filling(f, others):
    fibers = [f]
    for g in others:
        if sum(map(euler_number, fibers)) + euler_number(g) <= 12:
            fibers.append(g)
    fibers += [I(1)] * (12 - sum(map(euler_number, fibers)))
    c = FiberConfiguration(tuple(fibers))
    for g in set(c.fibers) - set(NONREDUCED):
        assert rnrf_base_change_euler(c, f, g) == 12
        assert validate_configuration(rnrf_base_change_configuration(c, f, g)).euler_sum == 12
