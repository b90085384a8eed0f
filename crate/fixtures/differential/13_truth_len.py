q = [1, 2, 3]
popped = []
while len(q) != 0:
    popped.append(q.pop())
assert len(q) == 0
print(popped)
