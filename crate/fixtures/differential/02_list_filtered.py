xs = [3, -1, 4, -1, 5, -9, 2, 6]
a = []
for e in xs:
    if e > 0:
        a.append(e*e)
print(a, sum(a))
