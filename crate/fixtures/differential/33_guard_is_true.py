def g(x):
    return x
vals = []
for x in [1, True, 0, False]:
    vals.append(g(x) is True)
    if g(x) is True:
        vals.append("t")
print(vals)
