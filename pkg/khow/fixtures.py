"""Built-in models shared by the harness, the CLI and the tests."""
from .config import settings
from .models import Lts, PlanSet, Ults


def emp_fail_lts() -> Lts:
    return Lts.build(
        states=['w', 'u', 'v_r', 'x'],
        val={'w': ['p'], 'u': ['q'], 'v_r': ['r'], 'x': []},
        rel={'a': [('w', 'u')], 'b': [('u', 'v_r')], 'c': [('w', 'x')]},
        actions=['a', 'b', 'c'],
        atoms=['p', 'q', 'r'],
    )


def emp_fail(agent: str = None) -> Ults:
    """Single-agent model on which EMP and COMPKh both fail.

    Kh(p,q) and Kh(q,r) hold through {[a]} and {[b]}, but no plan set takes
    p-states to r-states, and no plan set is strongly executable everywhere.
    """
    agent = agent or settings.DEFAULT_AGENT
    plansets = (PlanSet.of([['a']]), PlanSet.of([['b']]), PlanSet.of([['a', 'b'], ['c']]))
    return Ults(emp_fail_lts(), (agent,), {agent: plansets})
