a = []
for e in range(3):
    a.append(e)
get = lambda: e
print(a, get())
