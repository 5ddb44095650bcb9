import random
import sys

import pytest
from hypothesis import settings

from wqotrees.corpus import random_monoid, random_tree
from wqotrees.split import construct_split

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def seeded(seed):
    return random.Random(seed)


def split_tree(seed, max_nodes=31, max_size=6):
    rng = seeded(seed)
    m = random_monoid(rng, max_size)
    t = random_tree(rng, m, 2 * rng.randint(0, max_nodes // 2) + 1)
    return t, construct_split(t)


@pytest.fixture
def rng():
    return random.Random(1234)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
