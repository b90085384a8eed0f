pairs = [(1, "one"), (2, "two")]
seen = {}
for p in pairs:
    if p[0] > 1:
        seen[p[1]] = p[0]
print(seen)
