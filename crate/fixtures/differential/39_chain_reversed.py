res = []
for x in range(6):
    res.append(x >= 1 and 4 > x)
    if 2 <= x and x <= 4:
        res.append("mid")
print(res)
