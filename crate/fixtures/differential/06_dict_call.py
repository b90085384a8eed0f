ks = [1, 2, 3]
f = str
b = {}
for k in ks:
    b[k] = f(k)
print(b)
