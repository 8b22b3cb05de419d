"""
Package de tests pour l'application.
""" 