import pytest


def pytest_addoption(parser):
    parser.addoption("--slow", action="store_true", default=False, help="run long-running example enumerations")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--slow"):
        return
    skip = pytest.mark.skip(reason="long-running; pass --slow to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


# the worked examples, shared between the acceptance and corpus tests so
# each long enumeration runs at most once per session
EXAMPLES = {
    "example1": ("2", "x,y", "x*y"),
    "example2": ("2", "x1,x2,x3,x4,x5",
                 "x1^3*x2*x3+x1^3*x2*x4+x1^2*x3*x4*x5+x1*x2*x3*x4*x5"
                 "+x1*x2*x4^2*x5+x2^2*x4^2*x5+x3*x4^2*x5^2+x4^3*x5^2"),
    "example3": ("5", "x,y,z", "(x^4+y^4+z^4)^4"),
    "example4": ("2", "x1,x2,x3,y1,y2,y3", "(x1*y2+x2*y1)*(x1*y3+x3*y1)"),
}


class ExampleRuns:
    def __init__(self):
        self._cache = {}

    def map(self, name):
        from fpure import CartierMap, PolynomialRing, parse_field

        field, names, u = EXAMPLES[name]
        ring = PolynomialRing(parse_field(field), names)
        return CartierMap(ring(u), 1)

    def __call__(self, name):
        """(result, seconds) of the full enumeration for ``name``."""
        import time

        from fpure.enumerator import enumerate_fixed

        if name not in self._cache:
            phi = self.map(name)
            t0 = time.perf_counter()
            res = enumerate_fixed(phi)
            self._cache[name] = (res, time.perf_counter() - t0)
        return self._cache[name]


@pytest.fixture(scope="session")
def examples():
    return ExampleRuns()
