if n % 2 == 1:
    pass
