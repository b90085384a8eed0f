a = []
for e in range(5):
    a.append(e)
print(a, e)
