import itertools

import pytest

from qlimit.boolfn import PartialFunction, catalog, compose

CORPUS_NAMES = ["I", "S", "NAND2", "MAJ3", "PrOR2", "PrOR3", "AND2", "OR2", "OR3",
                "PARITY2", "PARITY3", "CONST0_2"]


def all_strings(n):
    return ["".join(b) for b in itertools.product("01", repeat=n)]


def corpus():
    fs = {name: catalog(name) for name in CORPUS_NAMES}
    fs["S∘NAND2"] = compose(catalog("S"), catalog("NAND2"))
    fs["PARTIAL3"] = PartialFunction(3, {"000": 0, "011": 1, "101": 1, "110": 0})
    return fs


@pytest.fixture(scope="session")
def fs():
    return corpus()
