import operator

import pytest

from itoss.errors import InterfaceViolation
from itoss.field import PrimeModulus, make_rng
from itoss.generic import (
    IdealScheme,
    Operation,
    additive,
    convert,
    get_scheme,
    multiplicative,
    rns_with_identity,
    shamir_additive,
    verify_interface,
)
from itoss.netsim import Group, Transcript
from itoss.session import run_session
from itoss.shamir import share_generate


def ids(modulus, n):
    return [modulus(u) for u in range(1, n + 1)]


def test_additive_conversion_is_bit_identical():
    p = PrimeModulus(7919)
    conv = convert(get_scheme("shamir-additive", p))
    for seed in range(5):
        table = share_generate(p(1000 + seed), ids(p, 6), 3, make_rng(seed))
        group = Group(tuple(table.ids))
        a = run_session(table, group, 2, make_rng(seed + 50))
        b = conv.run_session(table, group, 2, make_rng(seed + 50))
        assert a.transcript.to_jsonl() == b.transcript.to_jsonl()
        assert a.secret == b.secret == 1000 + seed


@pytest.mark.parametrize("p", [7, 263, 7919])
def test_multiplicative_round_trip(p):
    modulus = PrimeModulus(p)
    scheme = get_scheme("shamir-multiplicative", modulus)
    conv = convert(scheme, verify=False)
    n = min(4, scheme.max_id)
    rng = make_rng(p)
    for _ in range(10):
        secret = scheme.sample_secret(rng)
        table = scheme.share_gen(secret, ids(modulus, n), 2, rng)
        assert conv.run_session(table, Group(tuple(table.ids)), 1, rng).secret == secret


def test_multiplicative_subgroup_parameters():
    assert get_scheme("shamir-multiplicative", PrimeModulus(263)).notes["q"] == 131


def test_multiplicative_masks_fold_to_one():
    p = PrimeModulus(7)
    op = multiplicative(p)
    for seed in range(20):
        r = rns_with_identity(Group(tuple(ids(p, 5))), 2, op, Transcript(), make_rng(seed))
        assert op.fold(r) == 1


def test_additive_masks_fold_to_zero():
    p = PrimeModulus(257)
    r = rns_with_identity(Group(tuple(ids(p, 7))), 3, additive(p), Transcript(), make_rng(0))
    assert sum(r, p.zero) == 0


def drop_one_sweep(scheme, n, t, seed):
    conv = convert(scheme, verify=False)
    rng = make_rng(seed)
    table = scheme.share_gen(scheme.sample_secret(rng), ids(scheme.modulus, n), t, rng)
    group = Group(tuple(table.ids))
    rcs, _ = conv.rcc(table, group, 1, Transcript(), rng)
    carrier = list(scheme.op.carrier())
    for missing in range(n):
        rest = rcs[:missing] + rcs[missing + 1 :]
        got = [conv.rcsr(rest + [x]) for x in carrier]
        assert sorted(v.value for v in got) == sorted(v.value for v in carrier)


def test_drop_one_sweep_p7():
    p = PrimeModulus(7)
    drop_one_sweep(get_scheme("shamir-additive", p), 3, 2, 0)
    drop_one_sweep(get_scheme("shamir-multiplicative", p), 2, 2, 0)


def test_bad_operation_is_rejected():
    p = PrimeModulus(7)
    good = shamir_additive(p)
    op = good.op
    broken = Operation("sub", operator.sub, op.identity, op.invert, op.sample, op.carrier)
    bad = IdealScheme("broken", p, broken, good.component, good.share_gen, op.carrier, op.carrier, op.sample, 6)
    with pytest.raises(InterfaceViolation):
        verify_interface(bad)
    with pytest.raises(InterfaceViolation):
        convert(bad)


def test_non_bijective_component_is_rejected():
    p = PrimeModulus(7)
    good = shamir_additive(p)
    bad = IdealScheme(
        "squash",
        p,
        good.op,
        lambda s, u, group: good.component(s, u, group) * 0,
        good.share_gen,
        good.op.carrier,
        good.op.carrier,
        good.op.sample,
        6,
    )
    with pytest.raises(InterfaceViolation):
        verify_interface(bad)


def test_unknown_scheme():
    with pytest.raises(InterfaceViolation):
        get_scheme("blakley", PrimeModulus(7))
