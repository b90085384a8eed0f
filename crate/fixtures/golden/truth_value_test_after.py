if n % 2:
    pass
