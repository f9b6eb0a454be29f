"""A tiny dispatch LP solved two ways: the simplex and brute-force vertex enumeration."""
import numpy as np

from gridmix.lp_core import GE, LE, LinearProgram, enumerate_vertices_oracle, solve

# two plants, 10 and 20 $/MWh, caps 60 and 100, demand 100
lp = LinearProgram.build(
    [20.0, 10.0],
    [([1, 1], GE, 100, "demand")],
    upper=[60, 100],
    var_names=["gas", "coal"],
)
print(lp.to_text())

res = solve(lp)
print(res.status.value, res.x, res.objective)  # coal covers all of it: x = [0, 100], cost 1000

oracle = enumerate_vertices_oracle(lp)
print("oracle agrees:", np.isclose(res.objective, oracle.objective))

# squeeze coal down and gas picks up the rest in merit order
lp2 = LinearProgram.build([20.0, 10.0], [([1, 1], GE, 100), ([0, 1], LE, 30)], upper=[80, None])
print(solve(lp2).x)  # [70, 30]

# no way to meet demand with the caps we have
print(solve(LinearProgram.build([1, 1], [([1, 1], GE, 10)], upper=[3, 3])).status.value)
