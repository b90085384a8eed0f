class Box:
    pass

b = Box()
b.w = 3
b.h = 4
area = b.w * b.h
print(area)
