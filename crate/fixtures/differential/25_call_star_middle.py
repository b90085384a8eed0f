a = [10, 20]
f = lambda *t: t
x, y = 1, 2
print(f(x, a[0], a[1], y))
