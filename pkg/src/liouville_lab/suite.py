"""The golden-backed command set: desk-scale runs whose outputs are frozen."""

GOLDEN_SUITE: list[tuple[str, list[str]]] = [
    ("sieve-1e7", ["sieve", "--lo", "1", "--hi", "10000000"]),
    ("variance-1e6-h100", ["variance", "--x", "1000000", "--h", "100", "--thresholds", "0.2", "--format", "json"]),
    ("patterns-1e7-k2", ["patterns", "--n", "10000000", "--k", "2"]),
    ("correlate-1e7", ["correlate", "--n", "10000000", "--shifts", "0,1"]),
    ("avg-chowla-1e6", ["avg-chowla", "--x", "1000000", "--h", "10", "--k", "2"]),
    ("log-chowla-1e8", ["log-chowla", "--x", "100000000", "--shift", "1"]),
    ("discrepancy-1e4", ["discrepancy", "--n", "10000"]),
    ("discrepancy-1e6", ["discrepancy", "--n", "1000000"]),
    ("large-values-V10", ["large-values", "--p", "10000", "--t", "10000", "--v", "10"]),
    ("large-values-V5", ["large-values", "--p", "10000", "--t", "10000", "--v", "5"]),
    ("hm-ratio", ["hm-ratio", "--n", "256", "--t", "10000", "--points", "50", "--trials", "20"]),
    ("twisted-primes-1e6", ["twisted", "--kind", "primes", "--x", "1000000", "--t", "0,100"]),
    ("decompose-turan-1e4", ["decompose", "--layers", "2:10", "--x", "10000", "--verify", "--turan", "--restricted"]),
    ("shortlong-1e6", ["shortlong", "--f", "lambda", "--x", "1000000", "--h", "1000", "--eps", "0.1"]),
    ("signchanges-mu-1e6", ["signchanges", "--f", "mu", "--n", "1000000"]),
    ("smooth-table", ["smooth", "--n", "1000000", "--eps", "0.3", "--c", "20", "--samples", "10000", "--lo", "1000000", "--hi", "2000000"]),
    ("wirsing-mu2-1e7", ["wirsing", "--f", "mu2", "--n", "10000000", "--cutoff", "1000000"]),
]


def golden_argv(name: str, argv: list[str], directory: str, threads: int = 1) -> list[str]:
    return argv + ["--golden-dir", directory, "--golden-name", name, "--threads", str(threads)]
