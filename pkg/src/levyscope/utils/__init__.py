"""src/levyscope/utils/__init__.py"""
