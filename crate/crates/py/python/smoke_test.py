import json
import pathlib

import fitting_quotients as fq

DATA = pathlib.Path(__file__).resolve().parents[2] / "core" / "tests" / "data"


def main():
    s = fq.smith_normal_form([[2, 4], [6, 8]])
    assert s.invariants == [2, 4], s.invariants

    t, inv = fq.symplectic_normal_form([[0, 2], [-2, 0]])
    assert inv == [2]

    h = fq.HeisenbergGroup([1, 2])
    assert h.rank == 2
    b = h.delta_bound("Q1")
    assert len(b) == 9 and b.contains_line() is None
    json.loads(b.tameness_certificate())

    line = fq.DeltaBound(2, [[[1, 0]], [[-1, 0]]])
    assert line.contains_line() is not None
    try:
        line.tameness_certificate()
        raise AssertionError("line-bearing bound certified")
    except fq.CertificateError:
        pass

    l = fq.lagrangian_avoiding(1, [[[1, 0]], [[0, 1]]])
    assert len(l) == 1 and 0 not in l[0]

    spec = (DATA / "overlap.json").read_text()
    report = fq.synthesize(spec)
    checks = report.verify()
    assert checks and report.final_bound.contains_line() is None
    assert report.to_json() == (DATA / "overlap.report.json").read_text()
    assert fq.verify_report(report.to_json()) == checks

    tampered = json.loads(report.to_json())
    tampered["final_bound"]["cones"].pop()
    try:
        fq.verify_report(json.dumps(tampered))
        raise AssertionError("tampered report accepted")
    except fq.CertificateError as e:
        print("rejected:", str(e).splitlines()[0])

    print("smoke test passed:", len(checks), "checks replayed")


if __name__ == "__main__":
    main()
