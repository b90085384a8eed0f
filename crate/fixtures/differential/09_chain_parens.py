out = []
for a in range(4):
    for c in range(4):
        b = 2
        ok = (a <= b) and (b < c + 1)
        out.append(ok)
print(out)
