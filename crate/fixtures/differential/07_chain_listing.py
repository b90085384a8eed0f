n1, n2 = 3, 4
hits = []
for i in range(12):
    if i > n1 and i <= n1 + n2:
        hits.append(i)
print(hits)
