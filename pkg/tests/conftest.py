import pytest

from mzvcomplex import cache


@pytest.fixture(scope="session", autouse=True)
def _isolated_cache(tmp_path_factory):
    # quotients persist within one run only
    cache.set_cache_dir(tmp_path_factory.mktemp("mzvc-cache"))
    yield
    cache.set_cache_dir(None)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for tag, _, _ in mod.CRITERIA:
        terminalreporter.write_line(mod.RESULTS.get(tag, f"---- {tag} not run"))
