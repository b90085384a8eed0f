a = {"x": 1, "y": 2, "z": 3}
b = {}
for k, v in a.items():
    b[k] = v
print(b)
