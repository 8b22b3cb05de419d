"""
Package principal de l'application.
""" 