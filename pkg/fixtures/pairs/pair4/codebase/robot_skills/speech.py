import rospy
import smach


class Say(smach.State):
    """Speak one sentence through the robot's text-to-speech system."""

    def __init__(self, robot, sentence, block=True):
        smach.State.__init__(self, outcomes=['spoken'])
        self.robot = robot
        self.sentence = sentence
        self.block = block

    def execute(self, userdata=None):
        self.robot.speech.speak(self.sentence, block=self.block)
        return 'spoken'
