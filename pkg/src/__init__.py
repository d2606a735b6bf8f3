# Empty __init__.py to make src a package
