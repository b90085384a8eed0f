e = "keep me"
rows = [("a", 1), ("b", 2)]
names = []
for row in rows:
    names.append(row[0])
print(e, names)
