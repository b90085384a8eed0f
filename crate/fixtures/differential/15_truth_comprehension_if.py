xs = list(range(20))
ys = [y for y in xs if y % 3 == 0]
print(ys)
