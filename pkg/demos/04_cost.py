"""How much cheaper is a cross-ratio than a homography estimate?

Times one five-point cross-ratio against one four-point DLT solve on the
same machine, interleaving the two so frequency scaling hits both alike.
"""

from pentaverify.bench import benchmark_costs, format_cost_table

table = benchmark_costs(iterations=10_000, seed=0)
print(format_cost_table(table), end="")
print(f"a homography costs about {table['ratio']:.0f} cross-ratios here")
