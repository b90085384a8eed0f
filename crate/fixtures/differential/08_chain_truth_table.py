import itertools
rows = []
for a, b, c in itertools.product(range(3), repeat=3):
    rows.append((a, b, c, a < b and b < c))
print(rows)
