"""Shared fixtures: cached per-spec pipeline and oracle runs."""

from __future__ import annotations

import pytest

from braceforge.abelian import GroupSpec
from braceforge.classify import classify_braces
from braceforge.holomorph import Hol, sylow_p_hol_generators
from braceforge.layered import brute_force_regular_oracle, enumerate_layered
from braceforge.subgroups import closure

ORACLE_SPECS = ["2", "3", "4", "2,2", "8", "2,4", "2,2,2", "4,4", "9", "3,3"]


class SpecRun:
    """Everything the tests need about one group spec, computed lazily."""

    def __init__(self, text: str):
        self.spec = GroupSpec.parse(text)
        ok, p = self.spec.is_p_group()
        assert ok
        self.p = p
        self.hol = Hol(self.spec)
        self._sylow = None
        self._survivors = None
        self._pipeline = None
        self._oracle_subs = None
        self._oracle_rows = None

    @property
    def sylow(self):
        if self._sylow is None:
            self._sylow = closure(self.hol, sylow_p_hol_generators(self.hol, self.p))
        return self._sylow

    @property
    def survivors(self):
        if self._survivors is None:
            self._survivors = enumerate_layered(self.sylow, self.spec.order)
        return self._survivors

    @property
    def pipeline_rows(self):
        if self._pipeline is None:
            self._pipeline = classify_braces(self.survivors)
        return self._pipeline

    @property
    def oracle_subs(self):
        if self._oracle_subs is None:
            self._oracle_subs = brute_force_regular_oracle(self.spec, self.p)
        return self._oracle_subs

    @property
    def oracle_rows(self):
        if self._oracle_rows is None:
            self._oracle_rows = classify_braces(self.oracle_subs)
        return self._oracle_rows


_CACHE: dict[str, SpecRun] = {}


@pytest.fixture(scope="session")
def spec_run():
    def get(text: str) -> SpecRun:
        if text not in _CACHE:
            _CACHE[text] = SpecRun(text)
        return _CACHE[text]

    return get
