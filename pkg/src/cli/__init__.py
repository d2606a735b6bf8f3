# Empty __init__.py to make cli a package
