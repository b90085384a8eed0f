odd = []
for n in range(10):
    if n % 2 == 1:
        odd.append(n)
print(odd)
