calls = []
def f():
    calls.append(1)
    return len(calls)
ok = 0 < f() and f() < 5
print(ok, len(calls))
