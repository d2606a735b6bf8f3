# Empty __init__.py to make pipeline a package
