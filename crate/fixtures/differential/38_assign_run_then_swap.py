lo = 0
hi = 10
mid = (lo + hi) // 2
t = lo
lo = hi
hi = t
print(lo, hi, mid)
