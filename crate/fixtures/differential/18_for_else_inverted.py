for n in range(2, 21):
    found = False
    for x in range(2, n):
        if n % x == 0:
            found = True; break
    if not found:
        print('prime', n)
