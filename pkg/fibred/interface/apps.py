from django.apps import AppConfig


class InterfaceConfig(AppConfig):
    name = "fibred.interface"
    label = "fibred_interface"
