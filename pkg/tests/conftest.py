import numpy as np
import pytest

from ecfv import prim_to_cons


def random_prims(rng, n, rho=(0.1, 10.0), p=(0.1, 10.0), umax=5.0):
    """Log-uniform density and pressure, uniform velocity."""
    r = np.exp(rng.uniform(np.log(rho[0]), np.log(rho[1]), n))
    pp = np.exp(rng.uniform(np.log(p[0]), np.log(p[1]), n))
    u = rng.uniform(-umax, umax, n)
    return np.stack([r, u, pp], axis=-1)


def random_states(rng, n, **kw):
    return prim_to_cons(random_prims(rng, n, **kw))


def nearby_states(rng, c, rel=0.1, du=0.5):
    """Perturb each state by up to ``rel`` in rho, p and ``du`` in u (a nearby time level)."""
    from ecfv import cons_to_prim

    w = cons_to_prim(c)
    w2 = w.copy()
    w2[..., 0] *= 1.0 + rng.uniform(-rel, rel, w.shape[:-1])
    w2[..., 2] *= 1.0 + rng.uniform(-rel, rel, w.shape[:-1])
    w2[..., 1] += rng.uniform(-du, du, w.shape[:-1])
    return prim_to_cons(w2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# --- acceptance summary -------------------------------------------------------

_criteria = {}
_deselected = {}


def _criterion_of(item):
    m = item.get_closest_marker("criterion")
    return m.args[0] if m else None


def pytest_deselected(items):
    for item in items:
        c = _criterion_of(item)
        if c is not None:
            _deselected.setdefault(c, []).append(item.name)


def pytest_collection_modifyitems(items):
    for item in items:
        c = _criterion_of(item)
        if c is not None:
            item.user_properties.append(("criterion", c))


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    c = props.get("criterion")
    if c is None:
        return
    if report.when == "call" or report.outcome != "passed":
        entry = _criteria.setdefault(c, {"passed": 0, "failed": 0, "skipped": 0, "notes": []})
        entry[report.outcome] += 1
        if "measured" in props and report.when == "call":
            entry["notes"].append(props["measured"])


def pytest_terminal_summary(terminalreporter):
    if not _criteria and not _deselected:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for c in sorted(set(_criteria) | set(_deselected)):
        e = _criteria.get(c, {"passed": 0, "failed": 0, "skipped": 0, "notes": []})
        verdict = "FAIL" if e["failed"] else ("PASS" if e["passed"] else "NOT RUN")
        extra = ""
        if c in _deselected:
            extra = f"; not selected: {', '.join(_deselected[c])} (run with -m slow)"
        tr.write_line(f"criterion {c}: {verdict} ({e['passed']} passed, {e['failed']} failed{extra})")
        for note in e["notes"]:
            tr.write_line(f"    {note}")
