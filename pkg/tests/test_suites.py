"""The verify suites must be reproducible case by case and must catch planted faults."""

from dataclasses import replace

import pytest

from aisle.cli import suites
from aisle.errors import InvalidInput
from aisle.tstruct import MembershipReport


def failures(name, cases=None, seed=0):
    return suites.run_suites(name, seed, cases, 1)["failures"]


def test_case_is_reproducible_alone():
    full = suites.run_suites("homological", 3, 10, 1)
    for i in range(10):
        r = suites.run_case("homological", 3, i)
        assert full["suites"][0]["outcomes"][i] == {"pass": "P", "escalated": "E"}.get(r["status"], "?")


def test_report_shape():
    r = suites.run_suites("bounded", 1, 4, 1)
    assert set(r) == {"suite", "seed", "cases", "passed", "undetermined", "failures", "suites"}
    assert r["cases"] == 4 and r["suites"][0]["outcomes"] == "PPPP"


def test_size_capped_by_corpus():
    assert suites.suite_size("stalk-witness") == len(suites.corpus()[0]) >= 20
    assert suites.suite_size("bounded") == len(suites.bounded_fixtures()) == 20
    assert suites.suite_size("stalk-witness", 1000) == suites.suite_size("stalk-witness")


def test_unknown_suite():
    with pytest.raises(InvalidInput):
        suites.run_suites("nope")


def test_parallel_matches_serial():
    a = suites.run_suites("fi-depth", 5, 6, 1)
    b = suites.run_suites("fi-depth", 5, 6, 2)
    assert a == b


# ---------------------------------------------------------------------------
# planted faults


def test_catches_wrong_coaisle(monkeypatch):
    monkeypatch.setattr(suites, "coaisle_member", lambda phi, X: MembershipReport(True, "coaisle"))
    assert failures("orthogonality", 30)
    assert failures("coaisle-agreement", 30)


def test_catches_depth_off_by_one(monkeypatch):
    real = suites.inf_rhom

    def shifted(I, X):
        r = real(I, X)
        return replace(r, value=r.value + 1)

    monkeypatch.setattr(suites, "inf_rhom", shifted)
    assert failures("fi-depth", 20)


def test_catches_wrong_membership(monkeypatch):
    real = suites.ideal_member

    class Flipped:
        def __init__(self, m):
            self.member = not m.member
            self.cofactors = m.cofactors

        def __bool__(self):
            return self.member

    monkeypatch.setattr(suites, "ideal_member", lambda f, I, certificate=False: Flipped(real(f, I, certificate)))
    assert failures("groebner-oracle", 10)


def test_catches_missing_witnesses(monkeypatch):
    monkeypatch.setattr(suites, "aisle_failure_by_primes", lambda phi, X, primes: [])
    assert failures("stalk-witness")


def test_catches_wrong_step_membership(monkeypatch):
    monkeypatch.setattr(suites, "prime_in_spc", lambda p, a: True)
    assert failures("synthesis", 10)


def test_catches_wrong_bound(monkeypatch):
    real = suites.bounded_below_check
    monkeypatch.setattr(suites, "bounded_below_check", lambda phi: replace(real(phi), m=None))
    assert failures("bounded")


def test_catches_bad_koszul(monkeypatch):
    real = suites.koszul_complex
    monkeypatch.setattr(suites, "koszul_complex", lambda I, ring=None: real(list(I.nonzero_gens)[:1] or I, ring))
    assert failures("homological", 40)
