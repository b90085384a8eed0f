for item in sales: a = item[0], item[1]
