sales = [(1, 2, 3), (4, 5, 6)]
for item in sales: a = item[0], item[1]
print(a)
