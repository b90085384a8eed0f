for x in range(2, n):
    if n % x == 0:
        break
else:
    pass
