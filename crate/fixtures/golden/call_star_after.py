dicts = load_crowdhuman_json(*sys.argv[1:4])
