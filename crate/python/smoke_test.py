"""Smoke test for the pctgen Python module."""

import pctgen

EQV_NETLIST = """\
# circuit eqv
INPUT x1
INPUT x2
INPUT x3
y1 = OR(x1, x2)
y2 = AND(y1, x3)
y3 = AND(x1, x3)
y4 = AND(x2, x3)
y5 = OR(y3, y4)
z = XOR(y2, y5)
OUTPUT z
"""


def main():
    n = pctgen.Circuit.from_netlist(EQV_NETLIST)
    assert n.num_inputs == 3, n
    assert not any(n.eval(format(i, "03b")) for i in range(8))

    full = pctgen.gen_pct(n)["tests"]
    assert full.kind == "CTS"
    assert pctgen.verify_cts(n, full) == "complete"
    assert pctgen.verify_cts(n, pctgen.TestSet.from_text("tests eqv 3 CTS 0\n000\n")) == "incomplete"

    inputs = pctgen.gen_pct(n, mode="inputs")["tests"]
    assert sorted(inputs.tests) == ["000", "001", "011", "101"], inputs.tests
    cut = pctgen.gen_pct(n, mode="cut", cut_size=2, tries=10, seed=3)["tests"]
    assert cut.kind in ("CTSA", "CTSAA")
    outputs, hits, rate = pctgen.run_tests(n, cut)
    assert hits == [] and rate == 0.0 and len(outputs) == len(cut)
    assert pctgen.TestSet.from_text(cut.to_text()).tests == cut.tests

    buf = pctgen.Circuit.from_netlist("INPUT x1\nz = BUF(x1)\nOUTPUT z\n")
    inv = pctgen.Circuit.from_netlist("INPUT x1\nz = NOT(x1)\nOUTPUT z\n")
    m = pctgen.miter(buf, inv)
    cx = pctgen.gen_pct(m, mode="inputs")["counterexample"]
    assert m.eval(cx)

    ssa = pctgen.build_ssa(n.encode(), "0" * 9)
    assert "ssa" in ssa and ssa["ssa"][0][0] == "0" * 9
    proj = pctgen.sem_str(n.encode(), [0, 1, 2])
    assert sorted(proj["points"]) == sorted(inputs.tests)
    assert len(pctgen.random_tests(n, 5, seed=1, distinct=True)) == 5

    try:
        pctgen.Circuit.from_netlist("INPUT a\nz = FOO(a)\nOUTPUT z\n")
    except ValueError:
        pass
    else:
        raise AssertionError("bad netlist accepted")
    print("smoke test ok")



if __name__ == "__main__":
    main()
