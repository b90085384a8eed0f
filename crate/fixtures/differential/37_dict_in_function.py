def index(words):
    out = {}
    for i, w in enumerate(words):
        out[w] = i
    if len(out) == 0:
        return None
    return out

print(index(["a", "b", "c"]), index([]))
