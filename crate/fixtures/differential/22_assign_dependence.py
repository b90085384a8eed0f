x = 1
y = x
x = 2
z = y + x
print(x, y, z)
