x = 5
steps = 0
while not x == 0:
    x -= 1
    steps += 1
print(steps, x)
