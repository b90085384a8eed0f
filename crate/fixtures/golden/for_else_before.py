finishedForLoop = True
for x in range(2, n):
    if n % x == 0:
        finishedForLoop = False
        break
if finishedForLoop:
    pass
