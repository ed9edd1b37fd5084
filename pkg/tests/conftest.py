import copy

import pytest

from foel_verify.stats import GLOBAL_STATS


@pytest.fixture
def keep_global_stats():
    """Тесты, которые пишут в общую статистику, не должны попадать в итоговую сводку."""
    saved = copy.deepcopy(vars(GLOBAL_STATS))
    GLOBAL_STATS.reset()
    yield GLOBAL_STATS
    GLOBAL_STATS.reset()
    vars(GLOBAL_STATS).update(saved)
