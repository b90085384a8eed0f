def find(xs, target):
    missing = True
    for i, v in enumerate(xs):
        if v == target:
            missing = False
            break
    if missing:
        return -1
    return i

print(find([4, 5, 6], 5), find([4, 5, 6], 7))
