from ._kernels import compiled_kernel_available, default_kernel, make_counter
from .apriori import (
    AssociationRule,
    EmptyTransactionList,
    Itemset,
    MinerConfig,
    RebuildRequired,
    RuleBase,
    RulesFormatError,
    as_fraction,
    default_config,
    derive_rules,
    load_rulebases,
    mine_frequent_itemsets,
    mine_rulebase,
    save_rulebases,
)

__all__ = [
    "AssociationRule",
    "EmptyTransactionList",
    "Itemset",
    "MinerConfig",
    "RebuildRequired",
    "RuleBase",
    "RulesFormatError",
    "as_fraction",
    "compiled_kernel_available",
    "default_config",
    "default_kernel",
    "derive_rules",
    "load_rulebases",
    "make_counter",
    "mine_frequent_itemsets",
    "mine_rulebase",
    "save_rulebases",
]
