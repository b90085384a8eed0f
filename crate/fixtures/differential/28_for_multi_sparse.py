sales = [(1, 2, 3), (4, 5, 6)]
total = 0
for item in sales:
    total += item[0] + item[2]
print(total)
