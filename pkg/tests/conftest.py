import pytest

from epuindex.corpus import TokenizerConfig
from epuindex.lexicon import lexicon_from_mapping, load_lexicon
from epuindex.synthetic import data_path


@pytest.fixture(scope="session")
def french():
    return TokenizerConfig.from_file(data_path("stopwords_fr.txt"))


@pytest.fixture(scope="session")
def demo_lexicon(french):
    return load_lexicon(data_path("lexicon_fr.toml"), french)


@pytest.fixture
def small_lexicon():
    return lexicon_from_mapping({
        "economy": ["économique"],
        "policy": ["politique", "banque centrale"],
        "uncertainty": ["incertitude"],
    })


# one summary line per acceptance criterion, with any recorded "detail"
_ACCEPTANCE: dict[str, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    detail = "; ".join(str(v) for k, v in report.user_properties if k == "detail")
    if report.when == "call" or report.outcome != "passed":
        _ACCEPTANCE[name] = ("PASS" if report.passed else "FAIL", detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE):
        status, detail = _ACCEPTANCE[name]
        number = int(name.split("_")[2])
        label = name.split("_", 3)[3].replace("_", " ")
        terminalreporter.write_line(f"[{status}] {number:2d}. {label}" + (f" ({detail})" if detail else ""))
