labels = []
for x in [0, 1, 2, 0]:
    labels.append("zero" if x == 0 else "nonzero")
print(labels)
