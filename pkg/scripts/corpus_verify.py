"""Run the structural, counting and weight checks over the seeded corpus and print totals."""

import argparse
from collections import Counter

from besk.certify import certificate_pipeline, pair_interaction_audit, r_threshold_ok, verify_certificate
from besk.merging import add_two_law, merge_1, merge_12, verify_structure
from besk.search import seeded_corpus


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=60)
    args = ap.parse_args()
    c = Counter()
    for seed, n, r, k, G in seeded_corpus(args.seeds):
        c["instances"] += 1
        M1, _ = merge_1(G)
        M2, log = merge_12(G, k, M1)
        for F in M2.parts:
            rep = verify_structure(G, F, k, log, mode="audit")
            c["clusters"] += 1
            c["clusters_m>=2"] += rep.m >= 2
            c["size_law_triggered"] += rep.size_bound is not None
            c["structure_findings"] += len(rep.findings())
        audit = pair_interaction_audit(G, k, M2)
        c["level2_pairs"] += audit.level2_pairs
        c["sumset_nontrivial"] += audit.sumset_nontrivial
        c["audit_findings"] += len(audit.findings)
        c["two_law_triggered"] += add_two_law(G, k, log)["triggered"]
        _, _, cert = certificate_pipeline(G, k)
        cr = verify_certificate(G, k, cert)
        tag = "at_threshold" if r_threshold_ok(r, k) else "below_threshold"
        c[tag] += 1
        c[f"weight_failures_{tag}"] += not (cr.pair_lemma_ok and cr.cluster_lemma_ok)
    for key in sorted(c):
        print(f"{key}: {c[key]}")


if __name__ == "__main__":
    main()
