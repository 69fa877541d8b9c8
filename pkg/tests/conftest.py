import pytest

from mechforge import data
from mechforge.catalog import ingest_corpus, load_corpus_dir
from mechforge.grader import load_rubric
from mechforge.miner import default_config, mine_rulebase
from mechforge.miner import apriori as apriori_module

from tests.oracle import validate_downward_closure


@pytest.fixture(scope="session")
def corpus_games():
    return load_corpus_dir(data.corpus_dir())


@pytest.fixture(scope="session")
def catalog(corpus_games):
    return ingest_corpus(corpus_games)


@pytest.fixture(scope="session")
def miner_config(catalog):
    return default_config(len(catalog.games))


@pytest.fixture(scope="session")
def rulebases(catalog, miner_config):
    return mine_rulebase(catalog, miner_config)


@pytest.fixture(scope="session")
def si_rubric():
    return load_rubric(data.rubric_path("space_invaders"))


@pytest.fixture(scope="session")
def si_source():
    return (data.corpus_dir() / "space_invaders.vgd").read_text(encoding="utf-8")


@pytest.fixture(autouse=True)
def closure_checked_mining(monkeypatch):
    """Every in-process mining run in the suite is validated for the
    Apriori downward-closure property and exact threshold conformance."""
    original = apriori_module.mine_frequent_itemsets

    def checked(transactions, config, kernel=None):
        result = original(transactions, config, kernel)
        validate_downward_closure(result, config)
        return result

    monkeypatch.setattr(apriori_module, "mine_frequent_itemsets", checked)
    monkeypatch.setattr("mechforge.miner.mine_frequent_itemsets", checked)
    yield
