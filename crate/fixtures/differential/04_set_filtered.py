b = set()
for e in [1, 2, 3, 4, 5, 6, 7, 3, 5]:
    if e % 2:
        b.add(e * 10)
print(sorted(b))
