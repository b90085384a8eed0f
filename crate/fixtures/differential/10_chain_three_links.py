vals = [(1, 2, 3, 4), (1, 3, 2, 4), (0, 0, 1, 2), (4, 3, 2, 1)]
for a, b, c, d in vals:
    print(a < b and b < c and c < d)
