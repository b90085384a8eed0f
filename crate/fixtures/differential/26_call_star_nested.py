a = [1, 2, 3, 4]
def g(*t):
    return sum(t)
def h(*t):
    return t
print(h(g(a[0], a[1]), a[2], a[3]))
