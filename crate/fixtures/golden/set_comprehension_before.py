b = set()
for e in range(10):
    b.add(e)
