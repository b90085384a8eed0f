items = [1, "a", 2.0, None, 3]
kept = []
for x in items:
    if isinstance(x, int) is False:
        continue
    kept.append(x)
print(kept)
