"""Acceptance run over every pipeline; exits non-zero if any stage fails"""

import sys

from darbouxembed.geometry.errata import detect_errata
from darbouxembed.main import DarbouxEmbed
from darbouxembed.models.curves import InitialCurve


def _line(name: str, report) -> bool:
    worst = max((r['max'] for r in report.residuals.values() if r['max'] is not None), default=0.0)
    print(f"  {name:<28} {'PASS' if report.verdict else 'FAIL'}   worst residual {worst:.3e}")
    return report.verdict


def main() -> int:
    system = DarbouxEmbed()
    results = []

    print("darbouxembed - acceptance validation")
    print("=" * 60)

    print("\n--- Integrability of the normal forms ---")
    for metric_id in system.catalog()['id']:
        results.append(_line(f"check {metric_id}", system.check(metric_id, grid=(6, 6))))
    for reference in ('sphere', 'hyperbolic-plane', 'perturbed-R1'):
        report = system.check(reference, grid=(6, 6))
        print(f"  {'check ' + reference:<28} {'rejected' if not report.verdict else 'ACCEPTED'}")
        results.append(not report.verdict)

    print("\n--- Embeddings of u^2 (dv^2 - du^2) ---")
    report, _ = system.embed(special=(1.0, 2.0), grid=(30, 30))
    results.append(_line("embed --special 1,2", report))
    report, _ = system.embed(special=(1.0, 4.0), grid=(30, 30), u_range=(-1.0, -0.2),
                             v_range=(0.2, 1.0), null_coords=True)
    results.append(_line("embed --special 1,4 (null)", report))

    print("\n--- Geometric Cauchy problem ---")
    report, _ = system.cauchy(InitialCurve.example2(), grid=(21, 21), t_range=(0.8, 1.2))
    results.append(_line("cauchy example2", report))
    print(f"  diagonal error {report.details['diagnostics']['diagonal_error']:.3e}")

    print("\n--- Extrinsic symmetry ---")
    for alpha, beta in ((3.0, 0.0), (3.0, 0.5), (5.0, 1.0)):
        report, _ = system.revolve('R1', alpha, beta, s_range=(0.05, 1.5), grid=(20, 20))
        results.append(_line(f"revolve R1 alpha={alpha:g} beta={beta:g}", report))

    print("\n--- Self test ---")
    results.append(_line("selftest", system.selftest(seed=0, samples=50)))

    print("\n--- Printed-formula discrepancies ---")
    for flag, found in detect_errata().items():
        print(f"  {flag:<40} {'reproduced' if found else 'not found'}")

    print("\n" + "=" * 60)
    failed = results.count(False)
    print("All stages passed." if not failed else f"{failed} stage(s) failed.")
    return 0 if not failed else 1


if __name__ == "__main__":
    sys.exit(main())
